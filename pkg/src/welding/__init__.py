"""
Конформные склейки: численные и замкнутые.
"""
