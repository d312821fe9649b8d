"""
Энергия Лёвнера драйверов и замкнутые формулы для минимизаторов.
"""
