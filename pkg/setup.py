# setup.py

from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    name="steinerminor",
    version="0.1.0",
    author="Zakk Yang",
    author_email="zakkyang@protonmail.com",
    description="Steiner point removal for weighted planar graphs: terminal minors with measured distortion",
    long_description=long_description,
    long_description_content_type="text/markdown",
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.8",
    install_requires=[
        "networkx>=2.6",
        "numpy",
        "scipy",
        "python-dotenv",
    ],
    extras_require={
        "tests": ["pytest", "hypothesis"],
    },
    entry_points={
        "console_scripts": ["steinerminor=steinerminor.cli:main"],
    },
    include_package_data=True,
)
