import os
import sys

# Lets ctest run against the build tree without installing the package.
_build_dir = os.environ.get("ZONOREACH_MODULE_DIR")
if _build_dir:
    sys.path.insert(0, _build_dir)
