import sys

from subchirp.main import main

sys.exit(main())
