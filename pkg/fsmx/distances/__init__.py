from __future__ import absolute_import, division, print_function
from .sat import *
from .finite import *
from .reduction import *
