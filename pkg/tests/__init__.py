"""
hermburg Test Suite
"""
