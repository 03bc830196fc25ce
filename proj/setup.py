import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name, sourcedir=""):
        super().__init__(name, sources=[])
        self.sourcedir = str(Path(sourcedir).resolve())


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        extdir = Path(self.get_ext_fullpath(ext.name)).parent.resolve()
        build_dir = Path(self.build_temp) / ext.name
        build_dir.mkdir(parents=True, exist_ok=True)
        cmake_args = [
            f"-DCMAKE_LIBRARY_OUTPUT_DIRECTORY={extdir}",
            f"-DPython_EXECUTABLE={sys.executable}",
            "-DCMAKE_BUILD_TYPE=Release",
            "-DRISWPT_BUILD_PYTHON=ON",
        ]
        subprocess.run(["cmake", ext.sourcedir, *cmake_args], cwd=build_dir, check=True)
        subprocess.run(
            ["cmake", "--build", ".", "--target", "_riswpt", "-j"],
            cwd=build_dir,
            check=True,
        )


setup(
    ext_modules=[CMakeExtension("riswpt._riswpt")],
    cmdclass={"build_ext": CMakeBuild},
)
