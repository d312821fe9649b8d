"""
Командная строка и набор проверок.
"""
