"""
Command handlers for the vee-insight CLI
"""
