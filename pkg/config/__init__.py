"""
Experiment configuration files for the DECoR waveform design toolkit
"""
