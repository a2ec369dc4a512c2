import sys

from spavs.cli import main

sys.exit(main())
