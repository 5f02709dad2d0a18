import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Reproducibility and analysis
SFS_SEED = int(os.getenv("SFS_SEED", "1"))
SFS_TEST_MODE = os.getenv("SFS_TEST_MODE", "fast")

# Sweep worker pool
SFS_WORKERS = int(os.getenv("SFS_WORKERS", str(os.cpu_count() or 1)))

# Output locations
SFS_DATA_DIRECTORY = os.getenv("SFS_DATA_DIRECTORY", "./sfs_data")
SFS_LOG_FILE = os.getenv("SFS_LOG_FILE", "sfs.log")
SFS_LOG_LEVEL = os.getenv("SFS_LOG_LEVEL", "INFO")
SFS_API_PORT = int(os.getenv("SFS_API_PORT", "9000"))

# Workload generation defaults
PERIOD_LIST = (100, 200, 500, 1000, 2000, 5000)
LAYER_RANGE = (4, 10)
WIDTH_RANGE = (2, 5)
# Relative node weights; the volume is split in proportion to a uniform draw from this range
WCET_WEIGHT_RANGE = (13, 30)
EDGE_PROBABILITY = float(os.getenv("SFS_EDGE_PROBABILITY", "0.5"))

# Sweep defaults
UTIL_GRID = "5:100:5"
SETS_PER_POINT = 100
