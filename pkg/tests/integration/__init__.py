"""This module contains integration tests for the application."""
