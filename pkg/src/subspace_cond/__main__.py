import sys

from subspace_cond.cli import main

sys.exit(main())
