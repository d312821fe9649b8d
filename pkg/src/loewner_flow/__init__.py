"""
Поток Лёвнера: эволюция точек вниз и вверх, трассировка кривых, образы основания.
"""
