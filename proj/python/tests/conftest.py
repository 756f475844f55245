import os
import sys

# Under ctest, PYTHONPATH points at the staged build; an editable install's
# redirecting finder would otherwise take precedence over it.
if os.environ.get("RBE_SLAB_STAGED"):
    sys.meta_path[:] = [f for f in sys.meta_path if "rbe_slab" not in type(f).__module__]
    sys.modules.pop("rbe_slab", None)
