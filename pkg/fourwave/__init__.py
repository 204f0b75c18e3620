"""Classical and quantum four-wave mixing: reduction, closed forms and their oracles."""
