# Simulation
DEFAULT_SIM_DT = 0.01
DEFAULT_HORIZON = 10.0
# Past included before time 0 in the Riemann sum, in time units
DEFAULT_TRUNCATION = 50.0

# Stable sampling
ALPHA_CAUCHY_SNAP = 1e-6
# |H - 1/alpha| below this is treated as independent increments
HURST_INDEPENDENT_SNAP = 1e-9

# Estimation
DEFAULT_THETA_GRID = tuple(float(k) for k in range(1, 21))
DEFAULT_TAU_MULTIPLES = (1, 2, 4, 8, 16)
# -ln(Phi) targeted at the largest theta (alpha regression) and at the largest lag (H regression)
CHAR_FN_CEILING = 2.0
HURST_CHAR_FN_CEILING = 1.0
CHAR_FN_EPS = 1e-12
PROVISIONAL_ALPHA_GRID = tuple(round(1.05 + 0.05 * k, 2) for k in range(20))
PROVISIONAL_THETA = (0.25, 0.5, 1.0, 1.5, 2.0)
ALPHA_HAT_FLOOR = 0.01
HURST_HAT_BOUNDS = (0.01, 0.99)

# Decomposition
DEFAULT_TOL = 1e-10
MAX_NEWTON_ITER = 100
NEWTON_START_OFFSET = 1e-3
COEFF_CACHE_SIZE = 4096

# Forecast
NO_SIGNAL_RTOL = 1e-14

# Study and backtest
DEFAULT_STUDY_LENGTH = 2001
DEFAULT_STUDY_D_SET = (2, 5, 20)
DEFAULT_BACKTEST_D_SET = tuple(range(2, 13))
DEFAULT_WINDOW = 720
DEFAULT_MASTER_SEED = 20240101
FRONTIER_D = 7

# Reports
FLOAT_SIGNIFICANT_DIGITS = 12
LFSM_HOME_ENV = "LFSM_HOME"
LFSM_LOG_LEVEL_ENV = "LFSM_LOG_LEVEL"
