"""
localqst - ground-state tomography from local Pauli measurements
"""

__version__ = "0.1.0"
__author__ = "localqst contributors"
