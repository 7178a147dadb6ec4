import sys

from knotreform.cli import main

sys.exit(main())
