"""Двунаправленное расписание на пути: валидатор, точные решатели, PTAS и редукции."""

__version__ = "0.1.0"
