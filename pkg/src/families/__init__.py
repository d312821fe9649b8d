"""
Структура семейств минимизаторов: системы ОДУ, многообразия, универсальность.
"""
