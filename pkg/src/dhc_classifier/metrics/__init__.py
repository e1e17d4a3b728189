from .accuracy import consistency_rate, evaluation_report, layer_accuracy, path_accuracy

__all__ = ['consistency_rate', 'evaluation_report', 'layer_accuracy', 'path_accuracy']
