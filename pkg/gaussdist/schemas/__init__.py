"""
Pydantic schemas for payloads, reports and run configuration.
"""
