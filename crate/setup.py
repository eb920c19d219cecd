"""Builds the Rust extension with cargo and ships it inside the package.

Neither maturin nor setuptools-rust is assumed; the only requirements are
a Rust toolchain and setuptools.
"""

import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import setup
from setuptools.command.build_py import build_py

ROOT = Path(__file__).parent.resolve()
PKG = ROOT / "python" / "shadow_py"


def cargo_build():
    subprocess.check_call(
        ["cargo", "build", "--release", "-p", "shadow-py"], cwd=ROOT
    )
    if sys.platform == "win32":
        built, dest = "shadow_py.dll", "shadow_py.pyd"
    elif sys.platform == "darwin":
        built, dest = "libshadow_py.dylib", "shadow_py.so"
    else:
        built, dest = "libshadow_py.so", "shadow_py.so"
    src = ROOT / "target" / "release" / built
    shutil.copy2(src, PKG / dest)


class BuildWithCargo(build_py):
    def run(self):
        cargo_build()
        super().run()


setup(cmdclass={"build_py": BuildWithCargo})
