from setuptools import setup, find_packages

with open("requirements.txt", "r") as fs:
    reqs = [r for r in fs.read().splitlines() if (
        len(r) > 0 and not r.startswith("#"))]

version = '1.0.0'

with open("README.md", "r") as fh:
    long_description = fh.read()

setup(
    name='pyQSDC',
    version=version,
    packages=find_packages(exclude=['test']),
    install_requires=reqs,
    include_package_data=True,
    python_requires='>=3.6',
    description='Simulator and security analysis of GHZ-decoy and two-step quantum secure direct communication',
    long_description=long_description,
    long_description_content_type="text/markdown",
    keywords=['quantum', 'qsdc', 'dense coding', 'ghz', 'eavesdropping', 'simulation', 'pyQSDC'],
    entry_points={'console_scripts': ['qsdc = pyQSDC.cli:main']},
    classifiers=[],
)
