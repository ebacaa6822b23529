import setuptools
# from tribec import __version__


with open('README.md') as f:
    long_description = f.read()

setuptools.setup(
    name='tribec',
    # Lives in setup.cfg so that installing tribec does not import it, which
    # would fail in an isolated build before numpy and scipy are present.
    # version=__version__,
    description='Quantum and mean-field dynamics of three coupled Bose-Einstein condensates.',
    long_description=long_description,
    long_description_content_type="text/markdown",
    license='Apache License 2.0',
    python_requires='>= 3.9',

    # See: https://pypi.python.org/pypi?%3Aaction=list_classifiers
    classifiers=[
        'Development Status :: 3 - Alpha',

        'Intended Audience :: Science/Research',

        'Topic :: Scientific/Engineering :: Physics',
        'Environment :: Console',
        'Operating System :: MacOS :: MacOS X',
        'Operating System :: POSIX',

        'License :: OSI Approved :: Apache Software License',

        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3 :: Only',
    ],
    keywords=['Bose-Einstein condensate', 'self-trapping', 'SU(3)'],

    packages=setuptools.find_packages(exclude=['tests']),
    include_package_data=True,
    package_data={'tribec': ['config.yaml.template']},

    # click and PyYAML are pinned because sometimes projects do not strictly
    # follow semantic versioning. numpy and scipy get ranges instead, since
    # which exact release has wheels depends on the Python version.
    install_requires=[
        'click == 8.1.7',
        'numpy >= 1.24, < 3',
        'PyYAML == 6.0.2',
        'scipy >= 1.10, < 2',
    ],

    entry_points={
        'console_scripts': [
            'tribec = tribec.__main__:main',
        ],
    },
)
