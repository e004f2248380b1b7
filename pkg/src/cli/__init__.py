"""
Command layer: configuration loading and subcommand dispatch.
"""
