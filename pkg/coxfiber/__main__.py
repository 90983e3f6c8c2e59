import sys

from coxfiber.cli import main

sys.exit(main())
