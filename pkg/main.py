import sys
import warnings

from src.app import main


warnings.filterwarnings(
    "ignore",
    category=DeprecationWarning,
    message=r".*fork.*multi-threaded.*"
)


if __name__ == "__main__":
    sys.exit(main())
