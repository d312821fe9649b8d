"""
Библиотека драйверов: замкнутые формулы для семейств минимизаторов и модельных кривых.
"""
