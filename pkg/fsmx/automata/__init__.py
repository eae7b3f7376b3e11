from __future__ import absolute_import, division, print_function
from .core import *
from .weighted import *
