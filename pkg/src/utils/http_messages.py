HTTP_OK_MESSAGE = 'Success.'
HTTP_BAD_REQUEST_MESSAGE = 'Bad Request.'
HTTP_NOT_FOUND_MESSAGE = 'Not Found.'
HTTP_SERVICE_UNAVAILABLE_MESSAGE = 'Service Unavailable.'

HTTP_HEALTH_MESSAGE = HTTP_OK_MESSAGE + ' ' + 'Service is healthy.'
HTTP_MANIFEST_SUCCESS_MESSAGE = HTTP_OK_MESSAGE + \
    ' ' + 'Store manifest retrieved successfully!'
HTTP_STORE_NOT_LOADED_MESSAGE = HTTP_SERVICE_UNAVAILABLE_MESSAGE + \
    ' ' + 'No trail store is loaded.'
HTTP_ESTIMATE_SUCCESS_MESSAGE = HTTP_OK_MESSAGE + \
    ' ' + 'Cost estimate computed successfully!'
HTTP_ESTIMATE_UNKNOWN_PRESET_MESSAGE = HTTP_BAD_REQUEST_MESSAGE + \
    ' ' + 'Unknown preset.'
HTTP_ESTIMATE_UNKNOWN_SCHEME_MESSAGE = HTTP_BAD_REQUEST_MESSAGE + \
    ' ' + 'Unknown scheme.'

# Wire error frame messages
LIMIT_EXCEEDED_MESSAGE = 'limit-exceeded'
UNSUPPORTED_VERSION_MESSAGE = 'unsupported protocol version'
UNSUPPORTED_SCHEME_MESSAGE = 'unsupported scheme'
MODEL_MISMATCH_MESSAGE = 'model incompatible with scheme'
UNKNOWN_TOWN_MESSAGE = 'unknown town'
MISSING_KEY_MATERIAL_MESSAGE = 'server has no key material for scheme'
