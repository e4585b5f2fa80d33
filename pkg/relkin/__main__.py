import sys

from relkin.cli import main

sys.exit(main())
