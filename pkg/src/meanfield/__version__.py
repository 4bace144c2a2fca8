"""Version information for meanfield"""

__version__ = "1.0.0"
__author__ = "meanfield-maxima contributors"
__license__ = "GPL-3.0"
__description__ = "Monte Carlo study of normalized maxima in mean-field particle systems"
