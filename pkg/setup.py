from setuptools import setup, find_packages

setup(
    name="nanip-toolkit",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.10",
    install_requires=[
        'python-dotenv>=1.0.0',
        'pydantic>=2.5.2',
        'numpy>=1.26.2',
        'pandas>=2.1.4',
        'networkx>=3.1',
        'scipy>=1.11'
    ],
    entry_points={
        'console_scripts': ['nanip=src.cli:main'],
    },
)
