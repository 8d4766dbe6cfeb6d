"""
Shared linear-algebra, seeding and reporting helpers.
"""
