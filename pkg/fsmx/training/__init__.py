from .core import *
from .quantitygen import *
from .stringgen import *
from .datagen import *
from .trainer import *
