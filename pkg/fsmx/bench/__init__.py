from __future__ import absolute_import, division, print_function
from fsmx.bench.tomita import *
from fsmx.bench.metrics import *
from fsmx.bench.runner import *
