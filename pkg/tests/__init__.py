"""
Test suite for the EPPA witness toolkit
"""
