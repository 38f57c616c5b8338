# Zero-sum hard-money lending model
__version__ = "0.1.0"
