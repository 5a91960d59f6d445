"""Services package for the low-rank sum-of-squares toolkit."""
