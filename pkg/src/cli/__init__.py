from .state_io import StateFile, StateFileHandler
from .bench import BenchReport, BenchRunner, evaluate_instance
from .commands import build_parser, main

__all__ = [
    'StateFile',
    'StateFileHandler',
    'BenchReport',
    'BenchRunner',
    'evaluate_instance',
    'build_parser',
    'main'
]
