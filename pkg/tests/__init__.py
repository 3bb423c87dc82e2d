"""
Tests for the DECoR waveform design toolkit
"""
