HTTP_OK = 200
HTTP_BAD_REQUEST = 400
HTTP_NOT_FOUND = 404
HTTP_SERVICE_UNAVAILABLE = 503

# Process exit codes
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2

# Wire error frame codes
ERROR_NEGOTIATION = 0x01
ERROR_LIMIT_EXCEEDED = 0x02
ERROR_PROTOCOL = 0x03
ERROR_UNKNOWN_TOWN = 0x04
ERROR_INTERNAL = 0x05
