"""
Детерминированный SLE₀ с силовыми точками.
"""
