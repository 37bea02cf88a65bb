"""Build script: compiles the optional n-gram scoring kernel.

The package works without the extension (a pure-Python kernel is selected
at import time), so any build failure here downgrades to a warning.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build extensions, but never fail the install over them."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or Cython missing
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            f"warning: building the compiled scoring kernel failed ({exc}); "
            "falling back to the pure-Python implementation",
            file=sys.stderr,
        )


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython not available; skipping compiled kernel", file=sys.stderr)
        return []
    ext = Extension(
        "langscape.langid._scorer_c",
        sources=["src/langscape/langid/_scorer_c.pyx"],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
