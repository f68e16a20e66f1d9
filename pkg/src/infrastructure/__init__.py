"""Infrastructure module (file input/output)"""
