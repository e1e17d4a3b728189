from .decoders import beam_decode, decode, decode_batch, greedy_decode, heuristic_decode

__all__ = ['beam_decode', 'decode', 'decode_batch', 'greedy_decode', 'heuristic_decode']
