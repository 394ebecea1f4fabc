import sys

from hardycov.cli import main

sys.exit(main())
