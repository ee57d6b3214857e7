"""
Three-class biomarker accuracy: OVL and VUS estimators, bootstrap inference
and Monte Carlo studies.
"""

__version__ = "0.1.0"
