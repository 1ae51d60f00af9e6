import sys

from infcomp.cli import main

sys.exit(main())
