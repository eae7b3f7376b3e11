from __future__ import absolute_import, division, print_function
from .cells import *
from .model import *
from .diagnostics import *
