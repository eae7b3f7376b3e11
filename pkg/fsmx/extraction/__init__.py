from __future__ import absolute_import, division, print_function
from .oracles import *
from .kmeans import *
from .core import *
from .quantization import *
from .clustering import *
from .lstar import *
