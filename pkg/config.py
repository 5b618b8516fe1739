import os
from dotenv import load_dotenv

# Load environment variables from .env file using an absolute path so this
# works regardless of the working directory the process was launched from.
load_dotenv(os.path.join(os.path.dirname(os.path.abspath(__file__)), '.env'))

# --- RUNTIME ---
# Worker cap for ensemble evaluation (modnorm.equivalence_estimate)
THREADS = max(1, int(os.getenv("TFL_THREADS", "1")))
LOG_FILE = os.getenv("TFL_LOG_FILE", "tfloc.log")  # Empty string disables the file handler
LOG_LEVEL = os.getenv("TFL_LOG_LEVEL", "INFO")
DEFAULT_SEED = int(os.getenv("TFL_SEED", "0"))

# --- NORMALIZATION CONSTANTS ---
# All factors of N between the continuous theory and the finite model are
# pinned here and referenced by name in the modules:
#   stft:               no 1/N factor, so V*V = N * ||phi||^2 * I (Moyal)
#   localization op:    H_sigma = (1/N) V* sigma V, so sigma == 1 gives I
#   modulation norm:    mixed norm of m * V_phi f, times 1/N
#   Janssen expansion:  D_phi C_psi = (|L| / N) * sum_mu c_mu pi(mu) = (N / s(L)) * ...
LOCOP_SCALE_POWER = -1        # H_sigma carries N ** LOCOP_SCALE_POWER
MODNORM_SCALE_POWER = -1      # modulation_norm carries N ** MODNORM_SCALE_POWER

# --- TOLERANCES ---
TOL_HERMITIAN = 1e-9          # Relative residual above which a matrix is rejected as non-hermitian
TOL_FRAME_REL = 1e-10         # is_frame <=> A > TOL_FRAME_REL * B
TOL_RANK_REL = 1e-10          # Singular values below TOL_RANK_REL * max are treated as zero
TOL_PSD_CLIP = 1e-12          # Eigenvalues in [-TOL_PSD_CLIP, 0) are clipped to 0
TOL_WEXLER_RAZ = 1e-9
TOL_JANSSEN = 1e-10
TOL_UNIT_WINDOW = 1e-12
TOL_ESTIMATE = 1e-10          # Slack for the pointwise / concentration / sampling inequalities
TOL_WEIGHT_REL = 1e-12
TOL_DEGENERATE = 1e-10        # Eigenvalues this close (relative) form one degenerate cluster
GAUSSIAN_TAIL = 1e-15         # Periodization terms below this are dropped

# --- WEIGHTS ---
EXHAUSTIVE_WEIGHT_N = 8       # Pair checks are exhaustive up to this N, sampled above
WEIGHT_SAMPLE_PAIRS = 4096

# --- SEARCH & DIAGNOSTICS ---
CONDITIONED_TARGET = 10.0     # Default B/A target for the "conditioned" construction strategy
DECAY_THRESHOLDS = (0.9, 0.5, 0.1, 0.01)

# --- ENSEMBLES ---
# Signal i of an ensemble comes from family ENSEMBLE_MIX[i % len(ENSEMBLE_MIX)]
ENSEMBLE_MIX = ("noise", "gaussian", "chirp", "spike")
ENSEMBLE_COUNT = 200

# --- REPORTS ---
FLOAT_DIGITS = 17             # Significant digits for every float written to JSON / CSV
