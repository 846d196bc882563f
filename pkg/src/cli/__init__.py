"""
Command-line surface: experiment runner, artifact I/O and report export
"""
