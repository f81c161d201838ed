import os
import sys
import setuptools
import pathlib

install_requires = ["mpmath", "PyYAML", "jsonschema"]
tests_require = ["pytest", "pytest-cov"]
dev_requires = install_requires + tests_require + ["documenteer[pipelines]"]
scm_version_template = """# Generated by setuptools_scm
__all__ = ["__version__"]

__version__ = "{version}"
"""
tools_path = pathlib.PurePosixPath(setuptools.__path__[0])
base_prefix = pathlib.PurePosixPath(sys.base_prefix)
data_files_path = tools_path.relative_to(base_prefix).parents[1]

setuptools.setup(
    name="ts_zetaquad",
    description="Riemann zeta function evaluation with complex Gaussian quadrature",
    use_scm_version={
        "write_to": "python/lsst/ts/zetaquad/version.py",
        "write_to_template": scm_version_template,
        "fallback_version": "0.1.0",
    },
    setup_requires=["setuptools_scm"],
    install_requires=install_requires,
    package_dir={"": "python"},
    packages=setuptools.find_namespace_packages(where="python"),
    package_data={"": ["*.rst", "*.yaml"]},
    data_files=[(os.path.join(data_files_path, "schema"), ["schema/zetaquad.yaml"])],
    scripts=["bin/run_zetaquad.py"],
    tests_require=tests_require,
    extras_require={"dev": dev_requires},
    license="GPL",
    project_urls={
        "Source Code": "https://github.com/lsst-ts/ts_zetaquad",
    },
)
