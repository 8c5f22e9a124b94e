# following PEP 440
__version__ = "0.3.1"
