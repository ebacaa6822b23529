# See: https://docs.python.org/3/library/__main__.html
import sys

# tribec modules
from .tribec import main

if __name__ == '__main__':
    sys.exit(main())
