import sys

from starclip.cli import main

sys.exit(main())
