"""
Сравнение энергий двух семейств минимизаторов.
"""
