"""RIS-aided constant-envelope wireless power transfer."""

try:
    from ._riswpt import *  # noqa: F401,F403
    from ._riswpt import __doc__  # noqa: F401
except ImportError:
    # running from a build tree where the extension sits next to the package
    from _riswpt import *  # noqa: F401,F403
