from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext_modules = [
    Pybind11Extension(
        "qspecial._core",
        sources=[
            "src/qcore.cpp",
            "src/qbessel.cpp",
            "src/qneumann.cpp",
            "src/oracle.cpp",
            "src/verify.cpp",
            "python/bindings.cpp",
        ],
        include_dirs=["include", "src"],
        cxx_std=20,
    )
]

setup(ext_modules=ext_modules, cmdclass={"build_ext": build_ext})
