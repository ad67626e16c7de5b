from setuptools import setup

setup(name='kakeyalabpy',
      version='0.1.0',
      description='Exact experiments on arithmetic Kakeya quantities.',
      license='MIT',
      install_requires=[
          'tqdm',
          'scipy',
          'numpy',
          'sympy'
      ],
      extras_require={
          'test': ['pytest']
      },
      packages=['kakeyalabpy'],
      entry_points={
          'console_scripts': ['kakeyalab = kakeyalabpy.cli:main']
      },
      include_package_data=True,
      zip_safe=False)
