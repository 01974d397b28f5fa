import sys

from exciton_invariants.cli import main

sys.exit(main())
