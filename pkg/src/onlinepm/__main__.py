import sys

from onlinepm.cli import main

sys.exit(main())
