"""
LoewnerLab: численная эволюция Лёвнера для минимизаторов энергии с заданной
точкой и с заданной склейкой.
"""
