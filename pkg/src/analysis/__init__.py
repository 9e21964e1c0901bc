"""Bounds, random-graph expectations and integer-program export."""