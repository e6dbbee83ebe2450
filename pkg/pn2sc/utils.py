import os
import re
import sys

MODEL_SUFFIX = '.json'

if getattr(sys, 'frozen', False):
    # If the application is run as a bundle, the PyInstaller bootloader
    # extends the sys module by a flag frozen=True and sets the app
    # path into variable _MEIPASS'.
    ROOT_DIR = sys._MEIPASS
else:
    ROOT_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def get_version():
    """Version string from the VERSION file, 'unknown' if it is missing."""
    try:
        with open(os.path.join(ROOT_DIR, 'VERSION'), encoding='utf-8') as f:
            return f.read().strip()
    except OSError:
        return 'unknown'


def time_fmt(seconds):
    """Get human readable duration.

    Args:
        seconds (float): Duration in seconds.

    Return:
        str: Formatted duration, e.g. '812.0 µs', '3.4 ms', '1.2 s'.
    """
    value = seconds * 1e6
    for unit in ['µs', 'ms']:
        if abs(value) < 1000.0:
            return f'{value:3.1f} {unit}'
        value /= 1000.0
    return f'{value:3.1f} s'


def natural_key(s):
    """Sort key that orders numbers inside names by value (sp100 before sp1000)."""
    return [int(t) if t.isdigit() else t.lower() for t in re.split(r'(\d+)', s)]


def scandir(dir_path, suffix=MODEL_SUFFIX):
    """Paths of the visible files in ``dir_path`` ending with ``suffix``, not recursive."""
    for entry in os.scandir(dir_path):
        if not entry.name.startswith('.') and entry.is_file() and entry.name.endswith(suffix):
            yield entry.path


def get_model_list(folder):
    """Get the model documents in a folder, in natural order.

    Args:
        folder (str): Folder path.

    Returns:
        list[str]: Paths of the ``*.json`` files.
    """
    if folder == '':
        folder = './'
    model_list = [path.replace('\\', '/') for path in scandir(folder)]
    model_list.sort(key=natural_key)
    return model_list
