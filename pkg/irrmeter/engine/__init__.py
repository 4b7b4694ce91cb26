"""
Computation services: exact arithmetic, Padé construction, recurrences and measures.
"""
