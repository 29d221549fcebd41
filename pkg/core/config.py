"""Environment-driven configuration and module-wide defaults."""

import os

from dotenv import load_dotenv

load_dotenv()

# Environment
LOG_LEVEL = os.getenv("TVSENSE_LOG", "WARNING").upper()
DEFAULT_JOBS = int(os.getenv("TVSENSE_JOBS", "1"))
DEFAULT_SEED = int(os.getenv("TVSENSE_SEED", "0"))

# Audio
CAPTURE_RATE = 44100
FRAME_SECONDS = 0.025
HOP_SECONDS = 0.010
WINDOW_SECONDS = 1.0
ANTIALIAS_TAPS = 64
ANTIALIAS_CUTOFF = 0.45

# Features
N_MEL_FILTERS = 26
N_MFCC = 13
ENERGY_FLOOR = 1e-10

# SVM
SVM_C = 10.0
SVM_TOL = 1e-3
SVM_MAX_ITER = 100_000

# Background model
MIXTURE_COMPONENTS = 3
LEARNING_RATE = 0.02
MATCH_SIGMAS = 2.5
BACKGROUND_FRACTION = 0.7
VARIANCE_FLOOR = 4.0
INITIAL_VARIANCE = 225.0

# Rectangle detection
RDP_EPSILON_FRACTION = 0.02
MIN_AREA_FRACTION = 0.05
MAX_AREA_FRACTION = 0.70
MIN_COMPONENT_FRACTION = 0.005
FRAMES_PER_SHOT = 8
