"""
Setup script for the NER Corpus Toolkit

Tag scheme conversion and repair, data augmentation, consensus silver corpora,
Brill rule correction and entity-level scoring for NER training data.
"""

from setuptools import setup, find_packages
from pathlib import Path

this_directory = Path(__file__).parent
try:
    long_description = (this_directory / "README.md").read_text(encoding="utf-8")
except (UnicodeDecodeError, FileNotFoundError):
    long_description = "Desk-scale tooling for improving NER training corpora."


def read_requirements(filename):
    """Read requirements from file and return as list"""
    requirements_path = this_directory / filename
    if requirements_path.exists():
        with open(requirements_path, "r", encoding="utf-8") as f:
            return [
                line.split("#")[0].strip()
                for line in f
                if line.strip() and not line.startswith(("#", "-r"))
            ]
    return []


setup(
    name="ner-corpus-toolkit",
    version="0.1.0",
    description="Tag schemes, augmentation, consensus corpora and Brill rules for NER corpora",
    long_description=long_description,
    long_description_content_type="text/markdown",
    license="MIT",
    packages=find_packages(where="src", exclude=["tests*", "examples*"]),
    package_dir={"": "src"},
    python_requires=">=3.8",
    install_requires=read_requirements("requirements.txt"),
    extras_require={
        "dev": read_requirements("requirements-dev.txt"),
        "testing": [
            "pytest>=7.0.0",
            "pytest-mock>=3.10.0",
            "scipy>=1.7",
            "coverage>=6.0.0",
        ],
        "lint": [
            "black>=22.0.0",
            "flake8>=5.0.0",
            "mypy>=1.0.0",
        ],
    },
    keywords=["ner", "conll", "bioes", "data-augmentation", "brill", "semi-supervised", "clinical-nlp"],
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Developers",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3 :: Only",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
        "Topic :: Text Processing :: Linguistic",
        "Operating System :: OS Independent",
        "Environment :: Console",
        "Natural Language :: English",
    ],
    entry_points={
        "console_scripts": [
            "ner-toolkit=ner_corpus_toolkit.cli:main",
        ],
    },
    package_data={
        "ner_corpus_toolkit": ["data/*.tsv"],
    },
    zip_safe=False,
    include_package_data=True,
)
