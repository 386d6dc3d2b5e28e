from setuptools import setup, find_packages

setup(
    name="bargmann-propagators",
    version="0.1.0",
    description="Exact, bare semiclassical and uniform Airy coherent-state propagators",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={"bargmann": ["scenarios/*.env"]},
    python_requires=">=3.10",
    install_requires=[
        "numpy",
        "scipy",
        "pandas",
        "python-dotenv",
        "colorama",
        "tqdm",
    ],
    extras_require={"test": ["pytest"]},
    entry_points={"console_scripts": ["bargmann=bargmann.cli:main"]},
)
