import sys
from typing import List, Optional

from src.controllers.main_controller import MainController


def main(argv: Optional[List[str]] = None) -> int:
    controller = MainController()
    return controller.run(argv if argv is not None else sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
