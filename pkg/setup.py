from setuptools import setup, find_packages

setup(
    name="dhc-classifier",
    version="0.1.0",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    install_requires=[
        "numpy>=1.22",
        "pydantic>=2.0",
        "scikit-learn>=1.0",
        "tqdm>=4.60",
        "typing_extensions>=4.5.0",
    ],
    extras_require={
        "dev": [
            "pytest>=7.0",
            "pytest-asyncio>=0.21",
            "hypothesis>=6.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "dhc=dhc_classifier:main",
        ],
    },
    python_requires=">=3.9",
    description="Deep hierarchical text classification with hierarchical embeddings and loss"
)
