"""
PGET Reduced-Order Reconstruction
"""
