"""
Schemas for irrmeter inputs and reports.
"""
