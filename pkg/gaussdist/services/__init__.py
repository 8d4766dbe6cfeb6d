"""
Services package: measurements, entanglement functionals and the protocol harness.
"""
