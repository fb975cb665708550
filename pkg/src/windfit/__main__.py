import sys

from windfit.cli import main

sys.exit(main())
