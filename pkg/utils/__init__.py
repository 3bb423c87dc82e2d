"""
Utility modules for the DECoR waveform design toolkit
"""
