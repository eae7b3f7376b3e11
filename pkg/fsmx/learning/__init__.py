from __future__ import absolute_import, division, print_function
from fsmx.learning.reference import *
from fsmx.learning.rpni import *
from fsmx.learning.srm import *
from fsmx.learning.mps import *
from fsmx.learning.zeta import *
