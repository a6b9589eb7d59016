import os
from dotenv import load_dotenv

load_dotenv()

# Algorithm settings
DEFAULT_BETA = float(os.getenv("DEFAULT_BETA", "1.0"))
DEFAULT_TAU = float(os.getenv("DEFAULT_TAU", "1.0"))
DEFAULT_SEED = int(os.getenv("DEFAULT_SEED", "0"))
DEFAULT_PROVIDER = os.getenv("DEFAULT_PROVIDER", "ball-carving")
DEFAULT_MAX_ITERATIONS = int(os.getenv("DEFAULT_MAX_ITERATIONS", "64"))
DEFAULT_MAX_ESCALATIONS = int(os.getenv("DEFAULT_MAX_ESCALATIONS", "2"))
DEFAULT_STRICT_INVARIANTS = (
    os.getenv("DEFAULT_STRICT_INVARIANTS", "False").lower() == "true"
)

# Verification settings
DEFAULT_SAMPLE_THRESHOLD = int(os.getenv("DEFAULT_SAMPLE_THRESHOLD", "2000"))
DEFAULT_PAIR_SAMPLE = int(os.getenv("DEFAULT_PAIR_SAMPLE", "10000"))

# Output settings
DEFAULT_OUTPUT_DIR = os.getenv("DEFAULT_OUTPUT_DIR", "spr_output")

# Logging settings
DEFAULT_LOG_LEVEL = os.getenv("DEFAULT_LOG_LEVEL", "INFO")
DEFAULT_LOG_FILE = os.getenv("DEFAULT_LOG_FILE", "")
