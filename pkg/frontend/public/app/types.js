// Wire types for the analysis service (see the service's pydantic schemas).
export {};
