# GENERATED VERSION FILE
# TIME: Mon Oct 19 17:57:40 2026
__version__ = '0.1.0'
__gitsha__ = '0.1.0'
version_info = (0, 1, 0)
