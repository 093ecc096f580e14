import sys

from twocenters.cli import main

sys.exit(main())
