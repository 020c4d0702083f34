"""Linear fractional stable motion: simulation, estimation, decomposition and forecasting"""

from lfsm_common import __version__
