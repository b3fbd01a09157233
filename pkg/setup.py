"""Install bubbleflow and dependencies."""

try:
    from setuptools import setup, find_packages
except ImportError:
    from distutils.core import setup, find_packages

setup(name='bubbleflow',
      version='1.0',
      description="""Structure-preserving parametric finite elements for
      (an)isotropic surface diffusion of curve networks and surface clusters.""",
      author="bubbleflow team",
      use_scm_version=True,
      setup_requires=['setuptools_scm'],
      packages=find_packages(),
      package_data={'bubbleflow': ['examples/*']},
      install_requires=['numpy>=1.17', 'scipy>=1.12', 'netCDF4>=1.1.9', 'progressbar2'],
      entry_points={'console_scripts': [
          'bubbleflow = bubbleflow.scripts.run_cluster:main']}
      )
