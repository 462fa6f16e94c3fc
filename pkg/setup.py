"""Build script.

The compiled polynomial kernel (ncnet._kernel._cypoly) is optional: if
Cython or a C compiler is unavailable the package installs anyway and the
pure-Python kernel is used instead.
"""

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Swallow compiler failures so the pure-Python fallback still installs."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - depends on toolchain
            print(f"ncnet: skipping compiled kernel ({exc}); using pure-Python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - depends on toolchain
            print(f"ncnet: skipping {ext.name} ({exc}); using pure-Python fallback")


try:
    from Cython.Build import cythonize

    extensions = cythonize(
        ["src/ncnet/_kernel/_cypoly.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:  # pragma: no cover - depends on toolchain
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": OptionalBuildExt})
