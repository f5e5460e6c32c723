import sys

from kaprekar.cli import main

sys.exit(main())
