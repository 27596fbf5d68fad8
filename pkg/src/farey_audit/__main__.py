import sys

from farey_audit.cli import main

sys.exit(main())
